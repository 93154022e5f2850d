int lookup_12(int idx) {
    int name[8] = {0};
    return name[idx];
}
