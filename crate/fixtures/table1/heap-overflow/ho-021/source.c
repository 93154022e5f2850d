#include <stdlib.h>
#include <string.h>

char *dup_20(const char *src) {
    char *name = malloc(24);
    if (name == NULL) {
        return NULL;
    }
    strcpy(name, src);
    return name;
}
