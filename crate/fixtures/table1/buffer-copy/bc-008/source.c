#include <stdio.h>
#include <string.h>

void copy_7(const char *src) {
    char tmp[16];
    strcpy(tmp, src);
    puts(tmp);
}
