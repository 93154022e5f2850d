#define SLOTS_10 40

int set_10(int idx, int value) {
    int out[SLOTS_10] = {0};
    out[idx] = value;
    return out[0];
}
