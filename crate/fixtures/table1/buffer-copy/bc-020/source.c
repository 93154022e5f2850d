#include <stdio.h>
#include <string.h>

void copy_19(const char *src) {
    char line[16];
    strcpy(line, src);
    puts(line);
}
