#include <stdlib.h>
#include <string.h>

char *dup_6(const char *src) {
    char *field = malloc(8);
    if (field == NULL) {
        return NULL;
    }
    strcpy(field, src);
    return field;
}
