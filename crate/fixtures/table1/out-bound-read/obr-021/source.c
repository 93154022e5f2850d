int lookup_20(int idx) {
    int name[24] = {0};
    return name[idx];
}
