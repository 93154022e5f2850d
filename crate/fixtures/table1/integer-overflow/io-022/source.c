#include <stdlib.h>
#include <string.h>

char *join_21(const char *a, const char *c) {
    unsigned char total = strlen(a) + strlen(c) + 1;
    char *path = malloc(total);
    if (path == NULL) {
        return NULL;
    }
    strcpy(path, a);
    strcat(path, c);
    return path;
}
