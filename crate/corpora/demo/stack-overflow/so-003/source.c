#include <stdio.h>

int read_command(void) {
    char cmd[32];
    gets(cmd);
    return cmd[0] == 'q';
}
