int lookup_4(int idx) {
    int name[40] = {0};
    return name[idx];
}
