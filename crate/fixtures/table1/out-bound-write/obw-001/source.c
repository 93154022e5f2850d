#define SLOTS_0 8

int set_0(int idx, int value) {
    int dest[SLOTS_0] = {0};
    dest[idx] = value;
    return dest[0];
}
