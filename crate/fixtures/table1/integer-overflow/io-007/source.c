#include <stdlib.h>
#include <string.h>

char *join_6(const char *a, const char *c) {
    unsigned char total = strlen(a) + strlen(c) + 1;
    char *field = malloc(total);
    if (field == NULL) {
        return NULL;
    }
    strcpy(field, a);
    strcat(field, c);
    return field;
}
