#define ROWS 10

int sum_rows(const int *values) {
    int rows[ROWS];
    int total = 0;
    for (int i = 0; i <= ROWS; i++) {
        rows[i] = values[i];
        total += rows[i];
    }
    return total;
}
