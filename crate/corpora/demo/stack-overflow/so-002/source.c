#include <stdio.h>

static void ask_name(void) {
    char name[12];
    if (scanf("%s", name) != 1) {
        return;
    }
    printf("name=%s\n", name);
}

int main(void) {
    ask_name();
    return 0;
}
