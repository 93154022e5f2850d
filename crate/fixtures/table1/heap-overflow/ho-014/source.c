#include <stdlib.h>
#include <string.h>

char *dup_13(const char *src) {
    char *path = malloc(16);
    if (path == NULL) {
        return NULL;
    }
    strcpy(path, src);
    return path;
}
