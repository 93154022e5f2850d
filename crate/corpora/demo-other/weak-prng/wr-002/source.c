#include <stdlib.h>

void make_salt(unsigned char *salt, int n) {
    for (int i = 0; i < n; i++) {
        salt[i] = (unsigned char)(random() & 0xff);
    }
}
