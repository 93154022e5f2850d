#include <stdlib.h>
#include <string.h>

char *dup_19(const char *src) {
    char *line = malloc(16);
    if (line == NULL) {
        return NULL;
    }
    strcpy(line, src);
    return line;
}
