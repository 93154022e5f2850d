#include <stdlib.h>
#include <string.h>

char *dup_27(const char *src) {
    char *line = malloc(32);
    if (line == NULL) {
        return NULL;
    }
    strcpy(line, src);
    return line;
}
