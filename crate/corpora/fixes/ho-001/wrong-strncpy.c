#include <ctype.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static char *dup_upper(const char *s) {
    size_t n = strlen(s);
    char *copy = malloc(n);
    if (copy == NULL) {
        return NULL;
    }
    strncpy(copy, s, n);
    for (char *p = copy; *p != '\0'; p++) {
        *p = (char)toupper((unsigned char)*p);
    }
    return copy;
}

int main(void) {
    char line[128];
    if (fgets(line, sizeof line, stdin) == NULL) {
        return 1;
    }
    line[strcspn(line, "\n")] = '\0';
    char *up = dup_upper(line);
    if (up == NULL) {
        return 1;
    }
    puts(up);
    free(up);
    return 0;
}
