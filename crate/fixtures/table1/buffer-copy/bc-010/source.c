#include <stdio.h>
#include <string.h>

void copy_9(const char *src) {
    char buf[32];
    strcpy(buf, src);
    puts(buf);
}
