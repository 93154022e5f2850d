#include <stdlib.h>
#include <string.h>

size_t config_len(void) {
    const char *home = getenv("HOME");
    return strlen(home);
}
