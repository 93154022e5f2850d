#define SLOTS_14 24

int set_14(int idx, int value) {
    int field[SLOTS_14] = {0};
    field[idx] = value;
    return field[0];
}
