#include <stdlib.h>
#include <string.h>

char *dup_22(const char *src) {
    char *field = malloc(40);
    if (field == NULL) {
        return NULL;
    }
    strcpy(field, src);
    return field;
}
