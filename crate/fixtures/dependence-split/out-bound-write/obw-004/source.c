#define SLOTS_3 32

int set_3(int idx, int value) {
    int line[SLOTS_3] = {0};
    line[idx] = value;
    return line[0];
}
