#define SLOTS_15 32

int set_15(int idx, int value) {
    int tmp[SLOTS_15] = {0};
    tmp[idx] = value;
    return tmp[0];
}
