#include <stdio.h>
#include <string.h>

static void tally(const char *digits) {
    int counts[10] = {0};
    for (size_t i = 0; digits[i] != '\0'; i++) {
        int d = digits[i] - '0';
        counts[d]++;
    }
    for (int d = 0; d < 10; d++) {
        printf("%d", counts[d]);
    }
    putchar('\n');
}

int main(void) {
    char line[128];
    if (fgets(line, sizeof line, stdin) == NULL) {
        return 1;
    }
    line[strcspn(line, "\n")] = '\0';
    tally(line);
    return 0;
}
