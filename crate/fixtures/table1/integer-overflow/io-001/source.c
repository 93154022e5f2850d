#include <stdlib.h>
#include <string.h>

char *join_0(const char *a, const char *c) {
    unsigned char total = strlen(a) + strlen(c) + 1;
    char *dest = malloc(total);
    if (dest == NULL) {
        return NULL;
    }
    strcpy(dest, a);
    strcat(dest, c);
    return dest;
}
