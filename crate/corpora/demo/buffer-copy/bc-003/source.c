#include <string.h>

void build_path(char *out, const char *dir, const char *file) {
    char path[64];
    strcpy(path, dir);
    strcat(path, "/");
    strcat(path, file);
    strcpy(out, path);
}
