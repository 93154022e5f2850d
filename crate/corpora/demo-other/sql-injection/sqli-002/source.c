#include <string.h>
#include <sqlite3.h>

int delete_item(sqlite3 *db, const char *item) {
    char sql[128] = "DELETE FROM cart WHERE item = '";
    if (strlen(item) > 64) {
        return -1;
    }
    strcat(sql, item);
    strcat(sql, "'");
    return sqlite3_exec(db, sql, NULL, NULL, NULL);
}
