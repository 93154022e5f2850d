#define SLOTS_2 24

int set_2(int idx, int value) {
    int out[SLOTS_2] = {0};
    out[idx] = value;
    return out[0];
}
