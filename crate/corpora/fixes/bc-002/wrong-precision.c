#include <stdio.h>
#include <string.h>

static void print_tag(const char *user, int id) {
    char tag[24];
    sprintf(tag, "%.24s#%d", user, id);
    puts(tag);
}

int main(void) {
    char line[128];
    if (fgets(line, sizeof line, stdin) == NULL) {
        return 1;
    }
    line[strcspn(line, "\n")] = '\0';
    print_tag(line, 42);
    return 0;
}
