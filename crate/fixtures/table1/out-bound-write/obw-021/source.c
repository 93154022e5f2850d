#define SLOTS_20 24

int set_20(int idx, int value) {
    int name[SLOTS_20] = {0};
    name[idx] = value;
    return name[0];
}
