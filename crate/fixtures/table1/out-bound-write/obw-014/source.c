#define SLOTS_13 16

int set_13(int idx, int value) {
    int path[SLOTS_13] = {0};
    path[idx] = value;
    return path[0];
}
