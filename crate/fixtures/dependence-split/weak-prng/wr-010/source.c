#include <stdlib.h>

unsigned int token_9(void) {
    return (unsigned int)rand();
}
