#include <string.h>

int frame(char *dst, const char *payload, unsigned char extra) {
    char packet[128];
    unsigned char need = strlen(payload) + extra;
    if (need > sizeof(packet)) {
        return -1;
    }
    memcpy(packet, payload, strlen(payload) + extra);
    memcpy(dst, packet, 4);
    return 0;
}
