#include <stdlib.h>

unsigned int token_2(void) {
    return (unsigned int)rand();
}
