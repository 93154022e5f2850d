#include <stdio.h>
#include <string.h>

void copy_27(const char *src) {
    char line[32];
    strcpy(line, src);
    puts(line);
}
