#include <stdio.h>
#include <string.h>

void copy_22(const char *src) {
    char field[40];
    strcpy(field, src);
    puts(field);
}
