public void dumpReport() {
    emit("line 0");
    emit("line 1");
    emit("line 2");
    emit("line 3");
    emit("line 4");
    emit("line 5");
    emit("line 6");
    emit("line 7");
    emit("line 8");
    emit("line 9");
    emit("line 10");
    emit("line 11");
    emit("line 12");
    emit("line 13");
    emit("line 14");
    emit("line 15");
    emit("line 16");
    emit("line 17");
    emit("line 18");
    emit("line 19");
    emit("line 20");
    emit("line 21");
    emit("line 22");
    emit("line 23");
    emit("line 24");
    emit("line 25");
    emit("line 26");
    emit("line 27");
    emit("line 28");
    emit("line 29");
    emit("line 30");
    emit("line 31");
    emit("line 32");
    emit("line 33");
    emit("line 34");
    emit("line 35");
    emit("line 36");
    emit("line 37");
    emit("line 38");
    emit("line 39");
    emit("line 40");
    emit("line 41");
    emit("line 42");
    emit("line 43");
    emit("line 44");
    emit("line 45");
    emit("line 46");
    emit("line 47");
    emit("line 48");
    emit("line 49");
    emit("line 50");
    emit("line 51");
    emit("line 52");
    emit("line 53");
    emit("line 54");
}
