#define SLOTS_18 8

int set_18(int idx, int value) {
    int out[SLOTS_18] = {0};
    out[idx] = value;
    return out[0];
}
