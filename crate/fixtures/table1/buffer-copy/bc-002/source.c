#include <stdio.h>
#include <string.h>

void copy_1(const char *src) {
    char buf[16];
    strcpy(buf, src);
    puts(buf);
}
