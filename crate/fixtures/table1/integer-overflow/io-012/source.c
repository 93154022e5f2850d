#include <stdlib.h>
#include <string.h>

char *join_11(const char *a, const char *c) {
    unsigned char total = strlen(a) + strlen(c) + 1;
    char *line = malloc(total);
    if (line == NULL) {
        return NULL;
    }
    strcpy(line, a);
    strcat(line, c);
    return line;
}
