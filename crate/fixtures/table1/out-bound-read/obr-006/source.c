int lookup_5(int idx) {
    int path[48] = {0};
    return path[idx];
}
