#include <stdlib.h>

unsigned int token_6(void) {
    return (unsigned int)rand();
}
