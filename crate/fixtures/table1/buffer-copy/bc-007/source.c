#include <stdio.h>
#include <string.h>

void copy_6(const char *src) {
    char field[8];
    strcpy(field, src);
    puts(field);
}
