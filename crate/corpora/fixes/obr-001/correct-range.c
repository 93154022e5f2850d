#include <stdio.h>

static const char *level_name(int level) {
    const char *names[4] = {"debug", "info", "warn", "error"};
    if (level < 0 || level >= 4) {
        return "unknown";
    }
    return names[level];
}

int main(void) {
    int level;
    if (scanf("%d", &level) != 1) {
        return 1;
    }
    puts(level_name(level));
    return 0;
}
