#include <stdio.h>
#include <string.h>

void copy_12(const char *src) {
    char name[8];
    strcpy(name, src);
    puts(name);
}
