#define SLOTS_1 16

int set_1(int idx, int value) {
    int buf[SLOTS_1] = {0};
    buf[idx] = value;
    return buf[0];
}
