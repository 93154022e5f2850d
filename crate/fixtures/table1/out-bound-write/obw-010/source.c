#define SLOTS_9 32

int set_9(int idx, int value) {
    int buf[SLOTS_9] = {0};
    buf[idx] = value;
    return buf[0];
}
