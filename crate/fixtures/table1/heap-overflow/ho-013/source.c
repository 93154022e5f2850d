#include <stdlib.h>
#include <string.h>

char *dup_12(const char *src) {
    char *name = malloc(8);
    if (name == NULL) {
        return NULL;
    }
    strcpy(name, src);
    return name;
}
