#include <stdlib.h>
#include <string.h>

char *repeat(const char *word, size_t times) {
    unsigned short size = strlen(word) * times + 1;
    char *out = malloc(size);
    if (out == NULL) {
        return NULL;
    }
    out[0] = '\0';
    for (size_t i = 0; i < times; i++) {
        strcat(out, word);
    }
    return out;
}
