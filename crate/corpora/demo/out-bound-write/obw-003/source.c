#define SLOTS 12

int set_slot(int idx, int value) {
    int slots[SLOTS] = {0};
    slots[idx] = value;
    return slots[0];
}
