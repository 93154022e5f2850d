#include <stdio.h>
#include <string.h>

void copy_23(const char *src) {
    char tmp[48];
    strcpy(tmp, src);
    puts(tmp);
}
