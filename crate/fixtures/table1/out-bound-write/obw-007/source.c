#define SLOTS_6 8

int set_6(int idx, int value) {
    int field[SLOTS_6] = {0};
    field[idx] = value;
    return field[0];
}
