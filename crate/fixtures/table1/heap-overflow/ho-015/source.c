#include <stdlib.h>
#include <string.h>

char *dup_14(const char *src) {
    char *field = malloc(24);
    if (field == NULL) {
        return NULL;
    }
    strcpy(field, src);
    return field;
}
