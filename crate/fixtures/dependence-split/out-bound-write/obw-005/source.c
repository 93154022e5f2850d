#define SLOTS_4 40

int set_4(int idx, int value) {
    int name[SLOTS_4] = {0};
    name[idx] = value;
    return name[0];
}
