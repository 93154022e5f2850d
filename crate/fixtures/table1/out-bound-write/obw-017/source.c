#define SLOTS_16 40

int set_16(int idx, int value) {
    int dest[SLOTS_16] = {0};
    dest[idx] = value;
    return dest[0];
}
