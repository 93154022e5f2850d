#include <stdio.h>
#include <string.h>

void copy_14(const char *src) {
    char field[24];
    strcpy(field, src);
    puts(field);
}
