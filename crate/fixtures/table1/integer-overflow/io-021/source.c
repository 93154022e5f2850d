#include <stdlib.h>
#include <string.h>

char *join_20(const char *a, const char *c) {
    unsigned char total = strlen(a) + strlen(c) + 1;
    char *name = malloc(total);
    if (name == NULL) {
        return NULL;
    }
    strcpy(name, a);
    strcat(name, c);
    return name;
}
