#include <stdlib.h>
#include <string.h>

char *dup_11(const char *src) {
    char *line = malloc(48);
    if (line == NULL) {
        return NULL;
    }
    strcpy(line, src);
    return line;
}
