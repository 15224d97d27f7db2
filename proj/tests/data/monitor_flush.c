static void monitor_flush(Monitor *mon)
{
    const char *buffer = qstring_get_str(mon->outbuf);
    size_t len = qstring_get_length(mon->outbuf);
    int rc = 0;

    if (len && !mon->mux_out) {
        rc = qemu_chr_fe_write(mon->chr, (const uint8_t *) buffer, len);
        if (rc == len) {
            QDECREF(mon->outbuf);
            mon->outbuf = qstring_new();
            return;
        }
        if (rc > 0) {
            QString *tmp = qstring_from_str(buffer + rc);
            QDECREF(mon->outbuf);
            mon->outbuf = tmp;
        }
    }
}
