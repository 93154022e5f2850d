#include <stdlib.h>
#include <string.h>

char *dup_29(const char *src) {
    char *path = malloc(48);
    if (path == NULL) {
        return NULL;
    }
    strcpy(path, src);
    return path;
}
