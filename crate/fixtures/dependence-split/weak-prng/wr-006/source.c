#include <stdlib.h>

unsigned int token_5(void) {
    return (unsigned int)rand();
}
