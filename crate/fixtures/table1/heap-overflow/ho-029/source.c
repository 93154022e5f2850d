#include <stdlib.h>
#include <string.h>

char *dup_28(const char *src) {
    char *name = malloc(40);
    if (name == NULL) {
        return NULL;
    }
    strcpy(name, src);
    return name;
}
