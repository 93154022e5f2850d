#define SLOTS_17 48

int set_17(int idx, int value) {
    int buf[SLOTS_17] = {0};
    buf[idx] = value;
    return buf[0];
}
