#include <stdio.h>
#include <string.h>

static void reverse(const char *s) {
    char out[16];
    size_t n = strlen(s);
    if (n >= sizeof(out)) {
        puts("too long");
        return;
    }
    for (size_t i = 0; i < n; i++) {
        out[n - 1 - i] = s[i];
    }
    out[n] = '\0';
    puts(out);
}

int main(void) {
    char line[128];
    if (fgets(line, sizeof line, stdin) == NULL) {
        return 1;
    }
    line[strcspn(line, "\n")] = '\0';
    reverse(line);
    return 0;
}
