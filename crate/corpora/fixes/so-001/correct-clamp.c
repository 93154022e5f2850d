#include <stdio.h>
#include <string.h>

static void show_field(const unsigned char *data, size_t len) {
    char field[32];
    if (len > sizeof(field)) {
        len = sizeof(field);
    }
    memcpy(field, data, len);
    printf("%.*s\n", (int)len, field);
}

int main(void) {
    unsigned char buf[256];
    size_t n = fread(buf, 1, sizeof buf, stdin);
    if (n == 0) {
        return 1;
    }
    size_t len = buf[0];
    if (len > n - 1) {
        len = n - 1;
    }
    show_field(buf + 1, len);
    return 0;
}
