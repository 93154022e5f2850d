#include <stdlib.h>

int *make_counter(int start) {
    int *counter = malloc(sizeof(int));
    *counter = start;
    return counter;
}
