#include <stddef.h>
#include <openssl/sha.h>

void sign_token(const unsigned char *data, size_t len, unsigned char *out) {
    SHA1(data, len, out);
}
