#define SLOTS_11 48

int set_11(int idx, int value) {
    int line[SLOTS_11] = {0};
    line[idx] = value;
    return line[0];
}
