#include <stdlib.h>
#include <string.h>

char *join_7(const char *a, const char *c) {
    unsigned char total = strlen(a) + strlen(c) + 1;
    char *tmp = malloc(total);
    if (tmp == NULL) {
        return NULL;
    }
    strcpy(tmp, a);
    strcat(tmp, c);
    return tmp;
}
