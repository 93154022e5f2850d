#include <stdlib.h>
#include <string.h>

char *join_1(const char *a, const char *c) {
    unsigned char total = strlen(a) + strlen(c) + 1;
    char *buf = malloc(total);
    if (buf == NULL) {
        return NULL;
    }
    strcpy(buf, a);
    strcat(buf, c);
    return buf;
}
