#include <stdlib.h>
#include <string.h>

char *dup_23(const char *src) {
    char *tmp = malloc(48);
    if (tmp == NULL) {
        return NULL;
    }
    strcpy(tmp, src);
    return tmp;
}
