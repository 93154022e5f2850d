#define SLOTS_8 24

int set_8(int idx, int value) {
    int dest[SLOTS_8] = {0};
    dest[idx] = value;
    return dest[0];
}
