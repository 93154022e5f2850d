#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static char *join(const char *a, const char *b) {
    unsigned char total = strlen(a) + strlen(b) + 1;
    char *out = malloc(total);
    if (out == NULL) {
        return NULL;
    }
    strcpy(out, a);
    strcat(out, b);
    return out;
}

int main(void) {
    char first[512];
    char second[512];
    if (fgets(first, sizeof first, stdin) == NULL || fgets(second, sizeof second, stdin) == NULL) {
        return 1;
    }
    first[strcspn(first, "\n")] = '\0';
    second[strcspn(second, "\n")] = '\0';
    char *joined = join(first, second);
    if (joined == NULL) {
        return 1;
    }
    puts(joined);
    free(joined);
    return 0;
}
