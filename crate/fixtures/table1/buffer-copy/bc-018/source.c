#include <stdio.h>
#include <string.h>

void copy_17(const char *src) {
    char buf[48];
    strcpy(buf, src);
    puts(buf);
}
