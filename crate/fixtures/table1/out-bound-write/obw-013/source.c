#define SLOTS_12 8

int set_12(int idx, int value) {
    int name[SLOTS_12] = {0};
    name[idx] = value;
    return name[0];
}
