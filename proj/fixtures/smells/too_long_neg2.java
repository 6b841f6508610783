public void runSetup() {
    step0();
    step1();
    step2();
    step3();
    step4();
    step5();
    step6();
    step7();
    step8();
    step9();
    step10();
    step11();
    step12();
    step13();
    step14();
    step15();
    step16();
    step17();
    step18();
    step19();
    step20();
    step21();
    step22();
    step23();
    step24();
    step25();
    step26();
    step27();
    step28();
    step29();
}
