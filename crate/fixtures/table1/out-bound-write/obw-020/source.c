#define SLOTS_19 16

int set_19(int idx, int value) {
    int line[SLOTS_19] = {0};
    line[idx] = value;
    return line[0];
}
