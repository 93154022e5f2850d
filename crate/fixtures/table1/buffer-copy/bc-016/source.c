#include <stdio.h>
#include <string.h>

void copy_15(const char *src) {
    char tmp[32];
    strcpy(tmp, src);
    puts(tmp);
}
