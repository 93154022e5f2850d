#define SLOTS_21 32

int set_21(int idx, int value) {
    int path[SLOTS_21] = {0};
    path[idx] = value;
    return path[0];
}
