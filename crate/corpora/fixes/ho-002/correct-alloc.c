#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static char *with_ext(const char *base) {
    char *path = malloc(strlen(base) + 5);
    if (path == NULL) {
        return NULL;
    }
    strcpy(path, base);
    strcat(path, ".txt");
    return path;
}

int main(void) {
    char line[128];
    if (fgets(line, sizeof line, stdin) == NULL) {
        return 1;
    }
    line[strcspn(line, "\n")] = '\0';
    char *path = with_ext(line);
    if (path == NULL) {
        return 1;
    }
    puts(path);
    free(path);
    return 0;
}
