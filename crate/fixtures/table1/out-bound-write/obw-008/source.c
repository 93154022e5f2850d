#define SLOTS_7 16

int set_7(int idx, int value) {
    int tmp[SLOTS_7] = {0};
    tmp[idx] = value;
    return tmp[0];
}
