#include <stdio.h>
#include <string.h>

void copy_11(const char *src) {
    char line[48];
    strcpy(line, src);
    puts(line);
}
