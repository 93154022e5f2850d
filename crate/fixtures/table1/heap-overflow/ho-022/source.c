#include <stdlib.h>
#include <string.h>

char *dup_21(const char *src) {
    char *path = malloc(32);
    if (path == NULL) {
        return NULL;
    }
    strcpy(path, src);
    return path;
}
