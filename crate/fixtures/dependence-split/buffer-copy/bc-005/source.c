#include <stdio.h>
#include <string.h>

void copy_4(const char *src) {
    char name[40];
    strcpy(name, src);
    puts(name);
}
