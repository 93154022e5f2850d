#include <stdlib.h>
#include <string.h>

char *dup_7(const char *src) {
    char *tmp = malloc(16);
    if (tmp == NULL) {
        return NULL;
    }
    strcpy(tmp, src);
    return tmp;
}
