#include <stdio.h>
#include <string.h>

static void greet(const char *name) {
    char dest[16];
    if (strlen(name) >= sizeof(dest)) {
        puts("name too long");
        return;
    }
    strcpy(dest, name);
    printf("hello %s\n", dest);
}

int main(void) {
    char line[256];
    if (fgets(line, sizeof line, stdin) == NULL) {
        return 1;
    }
    line[strcspn(line, "\n")] = '\0';
    greet(line);
    return 0;
}
