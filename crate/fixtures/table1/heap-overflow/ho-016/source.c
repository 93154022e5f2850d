#include <stdlib.h>
#include <string.h>

char *dup_15(const char *src) {
    char *tmp = malloc(32);
    if (tmp == NULL) {
        return NULL;
    }
    strcpy(tmp, src);
    return tmp;
}
