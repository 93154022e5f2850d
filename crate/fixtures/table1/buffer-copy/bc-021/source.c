#include <stdio.h>
#include <string.h>

void copy_20(const char *src) {
    char name[24];
    strcpy(name, src);
    puts(name);
}
