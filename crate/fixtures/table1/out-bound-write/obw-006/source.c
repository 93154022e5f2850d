#define SLOTS_5 48

int set_5(int idx, int value) {
    int path[SLOTS_5] = {0};
    path[idx] = value;
    return path[0];
}
